// Pattern: P5 inline-func-varOutside
// Expected: NoDeadlock
//
// The goroutine captures both the channel and a value from the enclosing scope.
package main

import "fmt"

func main() {
	done := make(chan bool)
	values := []int{1, 2, 3}
	go func() {
		total := 0
		for _, v := range values {
			total += v
		}
		fmt.Println(total)
		done <- true
	}()
	<-done
}
